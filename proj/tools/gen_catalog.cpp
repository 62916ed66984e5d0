// Regenerates the derived catalog files: Strassen embedded into larger
// partitions, with the remaining block products done classically.
//
//   gen_catalog <catalog-dir>

#include "fmm/coefficients.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_catalog <catalog-dir>\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    const fmm::FmmSpec strassen = fmm::strassen_spec();
    fmm::save_spec(strassen, dir / "strassen.fmm");

    struct Target {
        std::size_t m, k, n;
    };
    for (const Target t : {Target{2, 3, 2}, Target{3, 2, 2}, Target{2, 2, 3}, Target{3, 3, 3}}) {
        const std::string name = "strassen" + std::to_string(t.m) + std::to_string(t.k) + std::to_string(t.n);
        const fmm::FmmSpec spec = fmm::embed_spec(strassen, t.m, t.k, t.n, name);
        if (!fmm::validate_brent(spec).passed()) {
            std::cerr << name << ": generated spec fails the Brent check\n";
            return 2;
        }
        fmm::save_spec(spec, dir / (name + ".fmm"));
        std::cout << name << " R=" << spec.rank << '\n';
    }
    return 0;
}
