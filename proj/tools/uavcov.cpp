#include <iostream>

#include "uavcov/cli.hpp"

int main(int argc, char** argv)
{
  return uavcov::cli::run(argc, argv, std::cout, std::cerr);
}
