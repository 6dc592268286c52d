#include "ample/dispatch.hpp"

int main(int argc, char** argv) { return ample::dispatch::runCli(argc, argv); }
