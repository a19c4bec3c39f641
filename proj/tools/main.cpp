#include "secgame/cli.hpp"

int main(int argc, char** argv) { return secgame::run_cli(argc, argv); }
