#include "ribfront/cli.hpp"

int main(int argc, char** argv) { return ribfront::cli::run(argc, argv); }
