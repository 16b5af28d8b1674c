#include "ordstat/cli.hpp"

int main(int argc, char** argv) { return ordstat::parse_and_dispatch(argc, argv); }
