#include "cli.hpp"

int main(int argc, char** argv)
{
    return uqbench::cli::run(argc, argv);
}
