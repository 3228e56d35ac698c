#include "treenash/cli.h"

int main(int argc, char** argv) { return treenash::cli::run(argc, argv); }
