#include "cli.hpp"

int main(int argc, char** argv) { return amc::cli::run(argc, argv); }
