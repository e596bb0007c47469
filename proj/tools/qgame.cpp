#include "qgame/cli.hpp"

int main(int argc, char** argv) { return qgame::cli::run(argc, argv); }
