#include "mpx/cli.hpp"

int main(int argc, char** argv) { return mpx::cli::run(argc, argv); }
