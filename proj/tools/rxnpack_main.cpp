#include <vector>

#include "rxnpack/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rxn::run_cli(args);
}
