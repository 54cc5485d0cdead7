#include <string>
#include <vector>

#include "sgmine/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sgmine::run_cli(args);
}
