#include "ramanpcr/cli.hpp"

int main(int argc, char** argv) { return ramanpcr::run_cli(argc, argv); }
