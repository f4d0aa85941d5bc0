#include <iostream>

#include "channelq/cli.hpp"

int main(int argc, char** argv) { return channelq::run_cli(argc, argv, std::cout, std::cerr); }
