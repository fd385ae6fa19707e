#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"

namespace hlsdiff {

// Flow-insensitive variable-level data dependence graph. Nodes are qualified
// variable names ("fn.var" or a global), channel names, and one synthetic
// "fn.return" per non-void function. An edge (src, dst) means a value of src
// can flow into dst through some assignment, call, push or pop.
struct DepGraph {
    std::set<std::string> nodes;
    std::map<std::string, std::set<std::string>> preds;  // dst -> sources
    std::map<std::string, std::set<std::string>> succs;  // src -> targets

    bool has_edge(const std::string& src, const std::string& dst) const;
    size_t edge_count() const;
};

DepGraph build_dep_graph(const Program& p);

struct SliceError {
    std::string message;
};

// Backward closure over the dependence graph starting from target. The
// frontier holds the slice members nothing else feeds: program inputs,
// never-written globals and never-pushed channels.
struct SliceResult {
    std::string target;                 // resolved node name
    std::vector<std::string> members;   // sorted, includes target
    std::vector<std::string> frontier;  // sorted subset of members
};

// target may be a node name ("main.return", "fn.var", a global or a
// channel) or a bare name resolved against the entry function first.
// Throws SliceError when it names nothing.
SliceResult backward_slice(const DepGraph& g, const Program& p,
                           const std::string& target);
SliceResult backward_slice(const Program& p, const std::string& target);

}  // namespace hlsdiff
