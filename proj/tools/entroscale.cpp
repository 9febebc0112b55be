#include <iostream>

#include "entroscale/cli.hpp"

int main(int argc, char** argv) { return entroscale::run(argc, argv, std::cout, std::cerr); }
