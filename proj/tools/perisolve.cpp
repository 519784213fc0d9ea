#include "app/commands.hpp"

int main(int argc, char** argv) { return perisolve::app::run_cli(argc, argv); }
