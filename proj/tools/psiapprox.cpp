#include <psiapprox/cli.hpp>

int main(int argc, char** argv) { return psiapprox::cli::run(argc, argv); }
