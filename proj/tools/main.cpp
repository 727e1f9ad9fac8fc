#include <eulerwedge/cli.hpp>

int main(int argc, char** argv) { return ew::cli::run_cli(argc, argv); }
