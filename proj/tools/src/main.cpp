#include "otdr/cli/cli.hpp"

int main(int argc, char** argv) { return otdr::cli::dispatch(argc, argv); }
