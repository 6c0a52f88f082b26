#include <iostream>

#include "seqtag/cli.hpp"

int main(int argc, char** argv) { return seqtag::cli::run(argc, argv, std::cout, std::cerr); }
