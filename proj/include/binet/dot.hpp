#ifndef BINET_DOT_HPP
#define BINET_DOT_HPP

#include "binet/core.hpp"

#include <string>

namespace binet {

/// Graphviz rendering: a cluster per agent that has an internal interface or
/// children, a node per agent, a point node per free port. Wires are followed
/// to their ends; an edge end at a principal port carries an arrowhead.
/// Agents are emitted in canonical order, so sibling order does not matter.
std::string export_dot(const Binet &net);

} // namespace binet

#endif
