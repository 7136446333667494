#include "bgkit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bgkit::run(argc, argv, std::cout, std::cerr); }
