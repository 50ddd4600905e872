#include "cli.hpp"

int main(int argc, char** argv) { return normsol::cli::main_entry(argc, argv); }
