#include "impq/cli.hpp"

int main(int argc, char** argv) { return impq::cli_dispatch(argc, argv); }
