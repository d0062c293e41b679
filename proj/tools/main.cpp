#include <iostream>

#include "flexccs/io.hpp"

int main(int argc, char** argv) { return flexccs::run_cli(argc, argv, std::cout, std::cerr); }
