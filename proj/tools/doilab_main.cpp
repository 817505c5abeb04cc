#include "doilab/cli.hpp"

int main(int argc, char** argv) { return doilab::cli::run(argc, argv); }
