#include <iostream>

#include "fcmstop/cli.hpp"

int main(int argc, char** argv) { return fcmstop::cli::run(argc, argv, std::cout, std::cerr); }
