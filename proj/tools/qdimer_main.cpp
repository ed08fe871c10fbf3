#include "qdimer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return qdimer::cli::run(argc, argv, std::cout, std::cerr);
}
