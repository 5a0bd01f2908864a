#include <iostream>

#include "searchreal/cli.hpp"

int main(int argc, char** argv) { return searchreal::cli::run(argc, argv, std::cout, std::cerr); }
