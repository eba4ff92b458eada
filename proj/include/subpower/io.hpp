#pragma once

#include <string>

#include <json.hpp>

#include "subpower/catalog.hpp"
#include "subpower/circuit.hpp"
#include "subpower/rep.hpp"
#include "subpower/solvers.hpp"

namespace subpower {

using json = nlohmann::json;

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// Optional keys besides the signature and algebras: "parallelogram" with
// {"d": int, "term": circuit} and "difference_term": circuit.
Catalog catalog_from_json(const json& j);
// Without a "parallelogram" key, a term is searched on the product of the
// algebras for d = 2, 3, 4.
Catalog load_catalog(const std::string& path);
void configure_by_search(Catalog& cat, int max_d = 4);
json catalog_to_json(const Catalog& cat);

// Gate ids number the inputs first; the op "P" stands for the parallelogram term.
Circuit circuit_from_json(const json& j, const Signature& sig);
json circuit_to_json(const Circuit& c, const Signature& sig);

SmpInstance instance_from_json(const json& j);
json instance_to_json(const SmpInstance& inst);
json answer_to_json(const SmpAnswer& a, const std::string& witness_file = "");

// Coordinates are 0-based; "pair" lists the ids of (u, uhat).
json rep_to_json(const Rep& R);
// Throws unless j has the shape written by rep_to_json and its ids are in range.
void validate_rep_json(const json& j);

}  // namespace subpower
