#include <iostream>
#include <string>
#include <vector>

#include "tpfem/run.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return tpfem::main_entry(args, std::cout, std::cerr);
}
