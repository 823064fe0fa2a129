#include "rankfd/cli.hpp"

int main(int argc, char** argv) { return rankfd::cli::run(argc, argv); }
