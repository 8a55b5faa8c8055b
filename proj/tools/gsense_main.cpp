#include <iostream>

#include "gsense/app/cli.hpp"

int main(int argc, char** argv) { return gsense::app::run_cli(argc, argv, std::cout, std::cerr); }
