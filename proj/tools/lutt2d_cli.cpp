#include "lutt2d/cli.hpp"

int main(int argc, char** argv) { return lutt2d::run(argc, argv); }
