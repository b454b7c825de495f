#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/bases.hpp"
#include "shadowlab/channel.hpp"
#include "shadowlab/ensembles.hpp"

namespace shadowlab {

// A shadow protocol: unitary ensemble plus measurement basis, with the
// analytic channel attached when one exists (everything except sn-gt).
struct Protocol {
  std::string id;
  ProtocolParams params;
  GroupEnsemble ensemble;
  MeasurementBasis basis;
  std::optional<ChannelSpec> spec;
  std::shared_ptr<const SchurBasis> schur;  // set for su2-tensor
};

// Supported ids: global-haar, global-clifford, local-clifford,
// local-clifford-bell, pauli, matchgate, particle-preserving, su2-spin,
// su2-tensor, orthogonal-real, orthogonal-split, symplectic, sn-permutation,
// sn-gt (exact channel only; deliberately carries no ChannelSpec).
Protocol make_protocol(const std::string& id, const ProtocolParams& params,
                       const Partition& gt_lambda = Partition(std::vector<int>{3, 1, 1}));

struct TableRow {
  std::string group;
  std::string hilbert;
  std::string subgroup;
  long long dim_lv = 0;
  long long n_lambda = 0;
  bool mult_free = true;
};

// One published-summary row per protocol; dimensions follow the published
// table's per-family conventions (see table notes in the README).
TableRow table_row(const std::string& id, const ProtocolParams& params);
std::vector<TableRow> default_table();
std::string table_csv(const std::vector<TableRow>& rows);

}  // namespace shadowlab
