#include <iostream>

#include "powerdual/cli.hpp"

int main(int argc, char** argv) { return powerdual::cli::run(argc, argv, std::cout, std::cerr); }
