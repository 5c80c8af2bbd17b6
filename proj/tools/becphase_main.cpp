#include <string>
#include <vector>

#include "becphase/config.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return becphase::run_command(args);
}
