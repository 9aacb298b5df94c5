#include "vectormix/cli.hpp"

int main(int argc, char** argv) { return vectormix::run_cli(argc, argv); }
