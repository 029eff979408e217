#include <iostream>

#include "moebiuslab/cli.hpp"

int main(int argc, char** argv) { return moebiuslab::run_cli(argc, argv, std::cout, std::cerr); }
