#include "vibclust/cli.hpp"

int main(int argc, char** argv) {
    return vibclust::cli::run(argc, argv);
}
