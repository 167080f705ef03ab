#include <iostream>

#include "deepfir/cli.hpp"

int main(int argc, char** argv) { return deepfir::run_cli(argc, argv, std::cout, std::cerr); }
