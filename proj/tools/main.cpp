#include <iostream>

#include "ratdyn/cli.hpp"

int main(int argc, char** argv) { return ratdyn::cli_dispatch(argc, argv, std::cout, std::cerr); }
