#include <iostream>

#include "klim/cli.hpp"

int main(int argc, char** argv)
{
    return klim::cli::run(argc, argv, std::cout, std::cerr);
}
