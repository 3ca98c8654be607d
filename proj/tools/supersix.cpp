#include "supersix/cli.hpp"

int main(int argc, char** argv) { return supersix::cli::run(argc, argv); }
