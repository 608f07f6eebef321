#include "cockedhat/cli.hpp"

int main(int argc, char** argv) { return cockedhat::cli::run(argc, argv); }
