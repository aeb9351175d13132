#ifndef GPLAB_CORPUS_HPP
#define GPLAB_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gplab/graded.hpp"
#include "gplab/json_io.hpp"

namespace gplab {

// Seed and size of the shipped reference corpus.
inline constexpr uint64_t kCorpusSeed = 20260822ull;
inline constexpr uint32_t kCorpusCount = 48;

// One generated example.  `data` is the full self-describing file record;
// data["graded"] re-parses to `graded` exactly.
struct CorpusCase {
    std::string name;    // "case_007"
    std::string family;  // which generator produced it
    GradedRing graded;
    Json data;
};

// A draw whose build ran past a cap.  Never silent: every skip is recorded
// with the cap code that stopped it.
struct CorpusSkip {
    std::string name;
    std::string family;
    std::string reason;
};

struct CorpusBatch {
    uint64_t seed = 0;
    std::vector<CorpusCase> cases;
    std::vector<CorpusSkip> skipped;
};

// Deterministic in (seed, count): each index gets its own generator stream,
// so case k is the same object no matter what happened to cases before it.
// Families rotate through group rings, skew group rings, partial skew
// rings, graded matrix rings, path algebras of random acyclic graphs,
// direct sums, and induced quotient gradings.  Element counts are capped
// at min(caps.max_elements, 2^16); oversized draws land in `skipped`.
CorpusBatch corpus_cases(uint64_t seed, uint32_t count, const Caps& caps = {});

// Builds the batch, writes case_NNN.json files and summary.json under
// out_dir (atomically: full write to a temp name, then rename), and runs
// the per-case analysis on a worker pool.  Finite grade groups get the
// full implication harness; lattice gradings get the decision certificate
// next to the identity-component result it reduces to.  An analysis that
// runs past a cap marks its summary entry instead of failing the run.
// Returns the summary.  Byte-identical across reruns with the same
// arguments.
Json generate_corpus(uint64_t seed, uint32_t count, const std::string& out_dir,
                     const Caps& caps = {});

}  // namespace gplab

#endif
