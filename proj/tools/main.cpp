#include "algdist/cli.hpp"

int main(int argc, char** argv) { return algdist::dispatch(argc, argv); }
