#include "hems/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hems::run_cli(argc, argv, std::cout, std::cerr);
}
