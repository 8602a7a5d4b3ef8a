#include "schiffer/cli.hpp"

int main(int argc, char** argv) { return schiffer::run_main(argc, argv); }
