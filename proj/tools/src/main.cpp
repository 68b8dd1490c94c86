#include <iostream>

#include "crowdyn/cli/commands.hpp"

int main(int argc, char** argv) { return crowdyn::cli::run(argc, argv, std::cout, std::cerr); }
