#pragma once

#include <nlohmann/json.hpp>

#include "ucp/beltrami.hpp"
#include "ucp/greens.hpp"
#include "ucp/landis.hpp"
#include "ucp/multiplier.hpp"
#include "ucp/operator.hpp"
#include "ucp/quasiball.hpp"
#include "ucp/scenarios.hpp"
#include "ucp/vanishing.hpp"

namespace ucp {

/// JSON views of the reports. Fields are summaries: sampled fields are written separately as CSV.
nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const ConditionReport& c);
nlohmann::json to_json(const StructureReport& r);
nlohmann::json to_json(const GreensField& g);
nlohmann::json to_json(const PerturbationStudy& p);
nlohmann::json to_json(const LogBracket& b);
nlohmann::json to_json(const QuasiGeometry& q);
nlohmann::json to_json(const AnnulusExponents& a);
nlohmann::json to_json(const SubsolutionResult& s);
nlohmann::json to_json(const SupersolutionResult& s);
nlohmann::json to_json(const PositiveSolutionResult& p);
nlohmann::json to_json(const PointwiseBounds& b);
nlohmann::json to_json(const MultiplierBundle& m);
nlohmann::json to_json(const SimilarityFactors& s);
nlohmann::json to_json(const ThreeCircleResult& t);
nlohmann::json to_json(const VanishingConfig& c);
nlohmann::json to_json(const VanishingOrder& o);
nlohmann::json to_json(const VanishingReport& r);
nlohmann::json to_json(const BoundCheck& b);
nlohmann::json to_json(const WindowParams& w);
nlohmann::json to_json(const IterationTrace& t);
nlohmann::json to_json(const SweepResult& s);
nlohmann::json to_json(const NumericalLeg& l);
nlohmann::json to_json(const LandisCertificate& c);
nlohmann::json to_json(const Scenario& s);

}  // namespace ucp
