#include <iostream>

#include "entroflow/cli.hpp"

int main(int argc, char** argv) { return entroflow::run_cli(argc, argv, std::cout, std::cerr); }
