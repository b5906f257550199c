#ifndef RELTURAN_FAMILY_HPP
#define RELTURAN_FAMILY_HPP

#include "relturan/detectors.hpp"
#include "relturan/hypergraph.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace relturan {

enum class FamilyKind {
    BergeCycle,           // all Berge l-cycles
    BergeUpTo,            // Berge l'-cycles, 2 <= l' <= l
    BergeNoSunflower,     // Berge l-cycles that are not sunflowers
    BergeUpToNoSunflower, // the same for 2 <= l' <= l
    LooseCycle,
    SunflowerPlus,        // a sunflower on 2..l edges plus one extra edge meeting its kernel
    F5,
    Union,
    ExplicitPatterns,
};

/**
 * Finite symbolic description of a forbidden family. The family applies to
 * hosts of any uniformity; members whose uniformity differs from the host's
 * simply never occur (F5 is 3-uniform, explicit patterns have their own r).
 *
 * String form (parse / to_string):
 *   berge:L  berge-upto:L  berge-nosun:L  berge-upto-nosun:L
 *   loose:L  sunplus:L  f5  pattern:R|a-b-c,a-b-d,...  file:<path.hg>
 * joined with '+' for unions. file: is resolved on parse and printed back as
 * pattern:, so the string form is a stable key.
 */
struct ForbiddenFamily {
    FamilyKind kind = FamilyKind::Union;
    int ell = 0;
    std::vector<ForbiddenFamily> members;
    std::vector<Hypergraph> patterns;

    static ForbiddenFamily berge(int ell);
    static ForbiddenFamily berge_upto(int ell);
    static ForbiddenFamily berge_nosun(int ell);
    static ForbiddenFamily berge_upto_nosun(int ell);
    static ForbiddenFamily loose(int ell);
    static ForbiddenFamily sunflower_plus(int ell);
    static ForbiddenFamily f5();
    static ForbiddenFamily explicit_patterns(std::vector<Hypergraph> patterns);
    // Flattens nested unions.
    static ForbiddenFamily union_of(std::vector<ForbiddenFamily> members);
    static ForbiddenFamily none() { return union_of({}); }

    static ForbiddenFamily parse(const std::string& text);
    std::string to_string() const;

    bool is_empty() const { return kind == FamilyKind::Union && members.empty(); }
};

// Pattern embedding certificate; `pattern` is the member that was found.
struct PatternWitness {
    Hypergraph pattern;
    Embedding embedding;
};

/**
 * Certificate of a family member inside a host. `member` is the string form
 * of the leaf family that matched.
 */
struct Witness {
    std::string member;
    std::variant<BergeCycle, PatternWitness, SunflowerPlus> certificate;

    // Host edge ids used by the certificate, sorted.
    std::vector<EdgeId> edges() const;
};

/**
 * Some member of `family` inside `h`. With `through`, only members using that
 * edge are searched (a member exists through e iff one of the returned kind does).
 */
std::optional<Witness> find_member(const Hypergraph& h, const ForbiddenFamily& family,
                                   std::optional<EdgeId> through = std::nullopt);
inline bool contains_member(const Hypergraph& h, const ForbiddenFamily& family)
{
    return find_member(h, family).has_value();
}

/**
 * Visits the edge sets (sorted, each once) of copies of members of `family`.
 * For Berge and sunflower-plus kinds the copies are the minimal ones searched
 * by the detectors (sunflower-plus copies have three edges); every member of
 * the family contains one of them, so hitting them all leaves the host free.
 * Throws ResourceError once more than `budget` copies have been produced.
 */
void for_each_copy(const Hypergraph& h, const ForbiddenFamily& family,
                   const std::function<void(std::span<const EdgeId>)>& visit,
                   std::size_t budget = 5'000'000);

/**
 * Re-checks a witness from scratch against the host and the family
 * definition: edges exist and are distinct, core incidences hold, sunflower
 * conditions hold, embeddings are injective and edge-preserving.
 */
bool validate_witness(const Hypergraph& h, const ForbiddenFamily& family, const Witness& w);

} // namespace relturan

#endif
