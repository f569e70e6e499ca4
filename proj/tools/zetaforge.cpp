#include "zetaforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace zetaforge;
    try {
        RunConfig config = parse_command_line(std::vector<std::string>(argv, argv + argc));
        return run(config, std::cout, std::cerr);
    } catch (const HelpRequested& h) {
        std::cout << h.what();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
