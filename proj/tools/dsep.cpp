#include "dsep/cli.hpp"

int main(int argc, char** argv) { return dsep::run(argc, argv); }
