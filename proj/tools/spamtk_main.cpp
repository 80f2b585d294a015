#include "spamtk/cli.hpp"

int main(int argc, char** argv) { return spamtk::run_cli(argc, argv); }
