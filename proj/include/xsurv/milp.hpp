#pragma once

#include <map>
#include <string>
#include <vector>

#include "xsurv/model.hpp"
#include "xsurv/optimizer.hpp"

namespace xsurv {

enum class MilpObjective { MaxTree, BaseSet };

struct MilpVariable {
    std::string name;
    double lower = 0.0;
    double upper = 0.0; // +inf encoded below
    bool binary = false;
};

struct MilpTerm {
    double coef;
    int var;
};

struct MilpConstraint {
    std::string name;
    std::vector<MilpTerm> terms;
    char sense = '='; // '<' (<=), '>' (>=), '='
    double rhs = 0.0;
};

// In-memory mixed-integer model; always a minimization.
struct MilpModel {
    std::string name;
    NodeId root_logical = 0; // s_0, the lowest-numbered logical node
    std::vector<MilpVariable> vars;
    std::map<std::string, int> var_index;
    std::vector<MilpTerm> objective;
    std::vector<MilpConstraint> constraints;

    int add_var(const std::string& name, bool binary, double lower = 0.0,
                double upper = milp_inf());
    int var(const std::string& name) const;
    static double milp_inf();
};

// Builds the routing/tree formulation over directed physical arc variables.
//   MaxTree: min sum c_ij x_ij — route a logical spanning tree (selection
//     variables z per logical link paired with continuous single-commodity
//     flows f capped by (|V_L|-1) z), x marks utilized physical links.
//   BaseSet: min sum c_ij g_ij — route every logical link (y), and for each
//     physical link either certify a surviving spanning structure by a
//     continuous flow w on logical arcs avoiding routes through it, or pay
//     for it with g.
// Variable naming: x_i_j, y_s_t_i_j, z_s_t, f_s_t, g_i_j, w_i_j_s_t.
MilpModel build_milp(const CrossLayerInstance& inst, MilpObjective which,
                     const WeightModel& weights);

// CPLEX LP text format (Minimize / Subject To / Bounds / Binary / End).
std::string write_lp(const MilpModel& model);

struct CheckReport {
    bool feasible = false;
    double objective = 0.0;
    std::vector<std::string> violations;
};

// Verifies a (possibly external) solution against every constraint, bound and
// integrality requirement; recomputes the objective. Variables absent from
// `values` count as 0.
CheckReport check_solution(const MilpModel& model, const std::map<std::string, double>& values,
                           double tol = 1e-6);

// Variable assignments realizing internal solver results, for cross-checking
// the exported models against the search-based solvers.
std::map<std::string, double> milp_solution_from_mapping(const CrossLayerInstance& inst,
                                                         const SolveResult& result);
std::map<std::string, double> milp_solution_from_tree(const CrossLayerInstance& inst,
                                                      const TreeResult& result);

} // namespace xsurv
