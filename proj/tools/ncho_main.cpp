#include <iostream>

#include "ncho/cli.hpp"

int main(int argc, char** argv) { return ncho::run(argc, argv, std::cout, std::cerr); }
