#include "cosy/cli.hpp"

int main(int argc, char** argv) { return cosy::cli_main(argc, argv); }
