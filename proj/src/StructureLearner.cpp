#include "mrnet/StructureLearner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

// Upper-tail critical value for the two-sided normal test at level alpha:
// the |z| with erfc(|z|/sqrt(2)) = alpha, found by bisection (no standard
// inverse-erfc available).
double criticalZ(double alpha) {
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid / std::sqrt(2.0)) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<int> lexOrder(const std::vector<std::string>& names) {
  std::vector<int> idx(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return names[static_cast<std::size_t>(a)] < names[static_cast<std::size_t>(b)];
  });
  return idx;
}

// All size-s subsets of `pool` (already name-sorted), in lexicographic order.
void appendSubsets(const std::vector<int>& pool, int s, std::vector<std::vector<int>>& out) {
  if (s == 0) {
    out.push_back({});
    return;
  }
  if (static_cast<int>(pool.size()) < s) return;
  std::vector<int> pick(static_cast<std::size_t>(s));
  std::vector<int> stackIdx(static_cast<std::size_t>(s), 0);
  // iterative combination enumeration
  int depth = 0;
  stackIdx[0] = 0;
  while (depth >= 0) {
    if (stackIdx[static_cast<std::size_t>(depth)] >
        static_cast<int>(pool.size()) - (s - depth)) {
      --depth;
      if (depth >= 0) ++stackIdx[static_cast<std::size_t>(depth)];
      continue;
    }
    pick[static_cast<std::size_t>(depth)] = pool[static_cast<std::size_t>(stackIdx[static_cast<std::size_t>(depth)])];
    if (depth == s - 1) {
      out.push_back(pick);
      ++stackIdx[static_cast<std::size_t>(depth)];
    } else {
      ++depth;
      stackIdx[static_cast<std::size_t>(depth)] = stackIdx[static_cast<std::size_t>(depth - 1)] + 1;
    }
  }
}

}  // namespace

SkeletonResult learnSkeleton(const FeatureMatrix& omics, const LearnConfig& config,
                             const AuditSink& audit) {
  if (config.maxCondSize < 0) throw ConfigError("learn_skeleton: max_cond_size must be >= 0");
  if (config.alpha <= 0.0 || config.alpha >= 1.0)
    throw ConfigError("learn_skeleton: alpha must lie in (0,1)");
  const auto& names = omics.features;
  const int p = static_cast<int>(names.size());
  const std::vector<int> order = lexOrder(names);

  // Adjacency over column indices; edge keys ordered by name.
  std::vector<std::set<int>> nbrs(static_cast<std::size_t>(p));
  std::vector<std::pair<int, int>> edgeList;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      edgeList.push_back({order[i], order[j]});
  std::sort(edgeList.begin(), edgeList.end(), [&](const auto& e1, const auto& e2) {
    return std::make_pair(names[static_cast<std::size_t>(e1.first)], names[static_cast<std::size_t>(e1.second)]) <
           std::make_pair(names[static_cast<std::size_t>(e2.first)], names[static_cast<std::size_t>(e2.second)]);
  });
  std::set<std::pair<int, int>> alive(edgeList.begin(), edgeList.end());
  for (const auto& [a, b] : edgeList) {
    nbrs[static_cast<std::size_t>(a)].insert(b);
    nbrs[static_cast<std::size_t>(b)].insert(a);
  }

  SkeletonResult result;
  const auto nameLess = [&](int a, int b) {
    return names[static_cast<std::size_t>(a)] < names[static_cast<std::size_t>(b)];
  };

  for (int s = 0; s <= config.maxCondSize; ++s) {
    // PC-stable: neighbor sets are frozen for the whole level.
    const std::vector<std::set<int>> frozen = nbrs;
    std::vector<std::pair<int, int>> removals;
    std::vector<SeparationRecord> seps;
    bool anyCandidate = false;

    for (const auto& [a, b] : edgeList) {
      if (!alive.count({a, b})) continue;

      std::vector<int> poolA(frozen[static_cast<std::size_t>(a)].begin(), frozen[static_cast<std::size_t>(a)].end());
      std::vector<int> poolB(frozen[static_cast<std::size_t>(b)].begin(), frozen[static_cast<std::size_t>(b)].end());
      poolA.erase(std::remove(poolA.begin(), poolA.end(), b), poolA.end());
      poolB.erase(std::remove(poolB.begin(), poolB.end(), a), poolB.end());
      std::sort(poolA.begin(), poolA.end(), nameLess);
      std::sort(poolB.begin(), poolB.end(), nameLess);

      std::vector<std::vector<int>> subsets;
      appendSubsets(poolA, s, subsets);
      appendSubsets(poolB, s, subsets);
      const auto nameTuple = [&](const std::vector<int>& v) {
        std::vector<std::string> t;
        for (int c : v) t.push_back(names[static_cast<std::size_t>(c)]);
        return t;
      };
      std::sort(subsets.begin(), subsets.end(),
                [&](const auto& u, const auto& v) { return nameTuple(u) < nameTuple(v); });
      subsets.erase(std::unique(subsets.begin(), subsets.end()), subsets.end());
      if (subsets.empty()) continue;
      anyCandidate = true;

      const double alphaEdge = config.bonferroniPerEdge
                                   ? config.alpha / static_cast<double>(subsets.size())
                                   : config.alpha;
      for (const auto& sub : subsets) {
        CITestResult r;
        try {
          r = ciTest(omics.values, names, a, b, sub, alphaEdge);
        } catch (const DataError& e) {
          throw DataError("edge " + names[static_cast<std::size_t>(a)] + "-" +
                          names[static_cast<std::size_t>(b)] + ": " + e.what());
        }
        if (audit) audit(r);
        if (r.independent) {
          removals.push_back({a, b});
          SeparationRecord rec;
          rec.a = names[static_cast<std::size_t>(a)];
          rec.b = names[static_cast<std::size_t>(b)];
          rec.separatingSet = nameTuple(sub);
          rec.pValue = r.pValue;
          seps.push_back(std::move(rec));
          break;
        }
      }
    }

    for (const auto& [a, b] : removals) {
      alive.erase({a, b});
      nbrs[static_cast<std::size_t>(a)].erase(b);
      nbrs[static_cast<std::size_t>(b)].erase(a);
    }
    result.separations.insert(result.separations.end(), seps.begin(), seps.end());
    if (!anyCandidate && s > 0) break;  // no edge has enough neighbors left to grow
  }

  for (const auto& [a, b] : edgeList)
    if (alive.count({a, b}))
      result.edges.push_back({names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)]});
  return result;
}

EdgeStatus voteDecision(int votesForward, int votesReverse, int minVotes, bool& forward) {
  forward = true;
  if (votesForward > 0 && votesReverse > 0) return EdgeStatus::Conflicted;
  if (votesForward >= minVotes && votesReverse == 0) return EdgeStatus::Directed;
  if (votesReverse >= minVotes && votesForward == 0) {
    forward = false;
    return EdgeStatus::Directed;
  }
  return EdgeStatus::Undirected;
}

OrientationOutcome orientPairwise(const std::string& a, const std::string& b,
                                  const FeatureMatrix& omics, const FeatureMatrix& ivScores,
                                  const Allocation& allocation, const LearnConfig& config,
                                  const AuditSink& audit) {
  std::map<std::string, Eigen::Index> omicCol, ivCol;
  for (std::size_t i = 0; i < omics.features.size(); ++i)
    omicCol[omics.features[i]] = static_cast<Eigen::Index>(i);
  for (std::size_t i = 0; i < ivScores.features.size(); ++i)
    ivCol[ivScores.features[i]] = static_cast<Eigen::Index>(i);

  OrientationOutcome out;
  for (const std::string& exposure : {a, b}) {
    const std::string& response = exposure == a ? b : a;
    auto it = allocation.byComponent.find(exposure);
    if (it == allocation.byComponent.end()) continue;
    for (const auto& entry : it->second) {
      auto iv = ivCol.find(entry.iv);
      if (iv == ivCol.end())
        throw DataError("orientation: allocated instrument '" + entry.iv +
                        "' missing from the instrument score matrix");
      ValidityResult v =
          validityFilter(ivScores.values.col(iv->second), entry.iv,
                         omics.values.col(omicCol.at(exposure)), exposure,
                         omics.values.col(omicCol.at(response)), response, config.alpha);
      if (audit) {
        audit(v.relevance);
        audit(v.exclusion);
      }
      OrientationEvidence ev;
      ev.iv = entry.iv;
      ev.exposure = exposure;
      ev.pass = v.pass;
      ev.relevance = v.relevance;
      ev.exclusion = v.exclusion;
      out.evidence.push_back(std::move(ev));
      if (v.pass) {
        if (exposure == a)
          ++out.votesForward;
        else
          ++out.votesReverse;
      }
    }
  }
  out.status = voteDecision(out.votesForward, out.votesReverse, config.minVotes, out.forward);
  return out;
}

namespace {

// Evidence strength of a directed edge: the weakest passing vote's distance
// to the decision boundary, over both halves of the validity filter.
double edgeMargin(const Edge& e, double zCrit) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ev : e.evidence) {
    if (!ev.pass || ev.exposure != e.a) continue;
    const double m = std::min(std::fabs(ev.relevance.statistic) - zCrit,
                              zCrit - std::fabs(ev.exclusion.statistic));
    best = std::min(best, m);
  }
  return best;
}

// One directed cycle found by DFS in lexicographic order, or empty.
std::vector<std::string> findCycle(const CausalGraph& g) {
  const auto children = g.childrenOf();
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> dfs = [&](const std::string& v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (const auto& c : children.at(v)) {
      if (state[c] == 1) {
        auto it = std::find(stack.begin(), stack.end(), c);
        cycle.assign(it, stack.end());
        return true;
      }
      if (state[c] == 0 && dfs(c)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };

  for (const auto& n : g.nodes) {
    if (state[n] == 0 && dfs(n)) return cycle;
  }
  return {};
}

}  // namespace

void repairCycles(CausalGraph& g, double alpha) {
  const double zCrit = criticalZ(alpha);
  for (;;) {
    const std::vector<std::string> cycle = findCycle(g);
    if (cycle.empty()) return;
    Edge* weakest = nullptr;
    double weakestMargin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const std::string& from = cycle[i];
      const std::string& to = cycle[(i + 1) % cycle.size()];
      Edge* e = g.findEdge(from, to);
      if (!e || e->status != EdgeStatus::Directed) continue;
      const double m = edgeMargin(*e, zCrit);
      if (!weakest || m < weakestMargin ||
          (m == weakestMargin && std::make_pair(e->a, e->b) < std::make_pair(weakest->a, weakest->b))) {
        weakest = e;
        weakestMargin = m;
      }
    }
    if (!weakest) throw InternalError("cycle repair found a cycle without directed edges");
    g.repairs.push_back({weakest->a, weakest->b, weakestMargin,
                         "directed cycle broken: weakest-evidence edge demoted to conflicted"});
    weakest->status = EdgeStatus::Conflicted;
  }
}

CausalGraph learnNetwork(const FeatureMatrix& omics, const FeatureMatrix& ivScores,
                         const Allocation& allocation, const LearnConfig& config,
                         const AuditSink& audit, std::vector<SeparationRecord>* separationsOut) {
  const SkeletonResult skel = learnSkeleton(omics, config, audit);
  if (separationsOut) *separationsOut = skel.separations;

  CausalGraph g;
  g.nodes = omics.features;
  std::sort(g.nodes.begin(), g.nodes.end());

  for (const auto& [a, b] : skel.edges) {
    OrientationOutcome o = orientPairwise(a, b, omics, ivScores, allocation, config, audit);
    Edge e;
    e.status = o.status;
    if (o.status == EdgeStatus::Directed && !o.forward) {
      e.a = b;
      e.b = a;
      e.votesForward = o.votesReverse;
      e.votesReverse = o.votesForward;
    } else {
      e.a = a;
      e.b = b;
      e.votesForward = o.votesForward;
      e.votesReverse = o.votesReverse;
    }
    e.evidence = std::move(o.evidence);
    g.edges.push_back(std::move(e));
  }

  repairCycles(g, config.alpha);
  g.sortCanonically();
  return g;
}

}  // namespace mrnet
