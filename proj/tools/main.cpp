#include "ringcut/cli.hpp"

int main(int argc, char** argv) {
    return ringcut::cli::cmd_dispatch(argc, argv);
}
