#include "stokes/cli_io.hpp"

int main(int argc, char** argv) {
    return stokes::io::run_cli(argc, argv);
}
