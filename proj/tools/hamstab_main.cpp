#include "hamstab/cli.hpp"

int main(int argc, char** argv) { return hamstab::cli::run(argc, argv); }
