#include <iostream>

#include "h2dfo/cli.hpp"

int main(int argc, char** argv) { return h2dfo::dispatch(argc, argv, std::cout, std::cerr); }
