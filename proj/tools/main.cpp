#include "dynkin/cli.hpp"

int main(int argc, char** argv) { return dynkin::cli::run(argc, argv); }
