#include <simplexlat/cli.hpp>

int main(int argc, char** argv) { return simplexlat::cli::run(argc, argv); }
