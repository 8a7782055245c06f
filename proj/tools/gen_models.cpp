// Regenerates the models/ corpus from the built-in documents. Run from the
// repository root after changing built-in parameters.

#include <cstdio>
#include <string>

#include "rxnpack/io.hpp"
#include "rxnpack/modeldsl.hpp"
#include "rxnpack/models.hpp"

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "models";
    for (const auto& name : rxn::builtin_model_names()) {
        std::string path = dir + "/" + name + ".rxn";
        rxn::atomic_write_file(path, rxn::serialize_model(rxn::builtin_document(name)));
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
