#include <string>
#include <vector>

#include "vnn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vnn::cli_main(args);
}
