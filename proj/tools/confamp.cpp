#include "confamp/cli.hpp"

int main(int argc, char **argv) { return confamp::cli::run(argc, argv); }
