#include <iostream>

#include "borel/app.hpp"

int main(int argc, char** argv) { return borel::app::run(argc, argv, std::cout, std::cerr); }
