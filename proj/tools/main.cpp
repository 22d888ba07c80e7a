#include "cli_app.hpp"

int main(int argc, char** argv) { return hbell::cli::run_cli(argc, argv); }
