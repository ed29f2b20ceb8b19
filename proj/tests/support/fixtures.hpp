#pragma once

#include <random>

#include "reflexive/homology_config.hpp"

namespace fixtures {

using reflexive::ConfigurationDatum;
using reflexive::EdgeType;

inline ConfigurationDatum dumbbell_datum() {
  ConfigurationDatum d;
  d.genus = 2;
  d.punctures = 0;
  d.edges = {"a1", "a2", "b1", "b2"};
  d.iota = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  d.extra_linear_constraints = {{1, -1, 0, 0}};
  d.tau = {EdgeType::horizontal, EdgeType::horizontal, EdgeType::vertical, EdgeType::vertical};
  d.sigma = {0, 1, 2, 3};
  d.e0 = 0;
  return d;
}

// E = {e1(h), e2(v)} on a rank-2 lattice, iota the identity.
inline ConfigurationDatum toy_datum() {
  ConfigurationDatum d;
  d.genus = 1;
  d.punctures = 0;
  d.edges = {"e1", "e2"};
  d.iota = {{1, 0}, {0, 1}};
  d.tau = {EdgeType::horizontal, EdgeType::vertical};
  d.sigma = {0, 1};
  return d;
}

// Two horizontal and two vertical edges on a rank-3 lattice with kernel (1,-1,0,0).
inline ConfigurationDatum closed_pair_datum() {
  ConfigurationDatum d;
  d.genus = 1;
  d.punctures = 2;
  d.edges = {"a1", "a2", "b1", "b2"};
  d.iota = {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  d.relations = {{1, -1, 0, 0}};
  d.tau = {EdgeType::horizontal, EdgeType::horizontal, EdgeType::vertical, EdgeType::vertical};
  d.sigma = {0, 1, 2, 3};
  return d;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

}  // namespace fixtures
