#ifndef NECKSPEC_ASSEMBLY_HPP
#define NECKSPEC_ASSEMBLY_HPP

#include "neckspec/mesh.hpp"
#include "neckspec/sparse.hpp"

#include <utility>

namespace neckspec {

/// P1 finite elements for the pencil K u = lambda M u. In two real
/// dimensions the Dirichlet energy is conformally invariant, so K uses
/// the flat chart metric and only the lumped mass M carries the density.
std::pair<SparseSym, SparseSym> assemble(const FiberMesh& mesh);

} // namespace neckspec

#endif
