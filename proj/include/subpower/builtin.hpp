#pragma once

#include <string>
#include <vector>

#include "subpower/catalog.hpp"

namespace subpower {

std::shared_ptr<const Signature> maltsev_signature();      // m/3
std::shared_ptr<const Signature> majority_signature();     // maj/3
std::shared_ptr<const Signature> lattice_signature();      // meet/2, join/2
std::shared_ptr<const Signature> semilattice_signature();  // meet/2

// Z_n with m(x,y,z) = x - y + z.
AlgebraPtr affine_cyclic(int n, std::shared_ptr<const Signature> sig);
// A group given by its multiplication table, with m(x,y,z) = x y^-1 z.
AlgebraPtr group_algebra(const std::string& name, const std::vector<std::vector<int>>& mul,
                         std::shared_ptr<const Signature> sig);
AlgebraPtr symmetric3(std::shared_ptr<const Signature> sig);
AlgebraPtr quaternion8(std::shared_ptr<const Signature> sig);
AlgebraPtr majority_chain(std::shared_ptr<const Signature> sig);
AlgebraPtr two_element_lattice(std::shared_ptr<const Signature> sig);
AlgebraPtr two_element_semilattice(std::shared_ptr<const Signature> sig);

Circuit maltsev_parallelogram(const Signature& sig);          // d = 2
Circuit majority_parallelogram(const Signature& sig);         // d = 3
Circuit lattice_majority_parallelogram(const Signature& sig); // d = 3

// Configured catalogs built from comma separated names among
// Z2..Z9, Z2xZ2, S3, Q8 (one Mal'tsev signature), L2 (majority),
// L2lat (meet and join).
Catalog builtin_catalog(const std::string& names);

}  // namespace subpower
