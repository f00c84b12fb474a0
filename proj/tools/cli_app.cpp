#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "opschur/completion.hpp"
#include "opschur/json_io.hpp"
#include "opschur/kv_extension.hpp"
#include "opschur/lebesgue.hpp"
#include "opschur/parallel.hpp"
#include "opschur/star_algebra.hpp"
#include "opschur/variational.hpp"

namespace opschur::cli {

namespace {

struct GlobalOptions {
  TolerancePolicy pol;
  std::uint64_t seed = 1;
  bool text = false;
};

Json load_doc(const std::string& path) { return parse_json_file(path); }

Matrix load_matrix(const std::string& path) {
  return matrix_from_json(load_doc(path));
}

void render_text(const Json& node, std::ostream& out, int indent) {
  const std::string pad(indent, ' ');
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_object() || (value.is_array() && !value.empty() &&
                                value[0].is_array())) {
        out << pad << key << ":\n";
        render_text(value, out, indent + 2);
      } else {
        out << pad << key << ": " << value.dump() << "\n";
      }
    }
  } else if (node.is_array()) {
    for (const auto& value : node) {
      if (value.is_object() || value.is_array()) {
        render_text(value, out, indent);
      } else {
        out << pad << value.dump() << "\n";
      }
    }
  } else {
    out << pad << node.dump() << "\n";
  }
}

void emit(const Json& report, const GlobalOptions& global, std::ostream& out) {
  if (global.text) {
    render_text(report, out, 0);
  } else {
    out << report.dump(2) << "\n";
  }
}

const char* error_kind(const Error& e) {
  if (dynamic_cast<const NotPositive*>(&e)) return "NotPositive";
  if (dynamic_cast<const NotCompletable*>(&e)) return "NotCompletable";
  if (dynamic_cast<const BlockNotPositive*>(&e)) return "BlockNotPositive";
  if (dynamic_cast<const NotExtensible*>(&e)) return "NotExtensible";
  if (dynamic_cast<const NotDefined*>(&e)) return "NotDefined";
  if (dynamic_cast<const NotRepresentable*>(&e)) return "NotRepresentable";
  if (dynamic_cast<const NotDominated*>(&e)) return "NotDominated";
  if (dynamic_cast<const RouteDisagreement*>(&e)) return "RouteDisagreement";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
  return "Error";
}

// ---------------------------------------------------------------------------
// Random instance generation for the verify subcommand.

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Random PSD matrix with a well-conditioned nonzero spectrum so that the
/// ascent-based oracle certifies tight values.
Matrix random_psd_matrix(int n, int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> level(0.4, 2.5);
  const Matrix q = random_unitary(n, rng);
  RealVector values = RealVector::Zero(n);
  for (int i = 0; i < rank; ++i) values(n - 1 - i) = level(rng);
  return q * values.asDiagonal() * q.adjoint();
}

Vector random_unit(int n, std::mt19937_64& rng) {
  Vector y = random_gaussian(n, 1, rng).col(0);
  return y / y.norm();
}

struct FormulaStats {
  int instances = 0;
  int converged = 0;
  double maxDeviation = 0.0;

  void record(double kernel, const OracleEstimate& estimate) {
    ++instances;
    if (!estimate.converged || estimate.unbounded) return;
    ++converged;
    maxDeviation = std::max(maxDeviation, std::abs(kernel - estimate.value));
  }

  Json toJson() const {
    return Json{{"instances", instances},
                {"converged", converged},
                {"maxDeviation", maxDeviation}};
  }
};

double quadratic_value(const Matrix& m, const Vector& y) {
  return (y.adjoint() * m * y)(0, 0).real();
}

Json run_verify(int instances, int maxDim, int budget,
                const GlobalOptions& global,
                const std::optional<Matrix>& suppliedA,
                const std::optional<Matrix>& suppliedB, bool* pass) {
  const TolerancePolicy& pol = global.pol;
  std::mt19937_64 rng(global.seed);
  std::uniform_int_distribution<int> dimDist(2, std::max(2, maxDim));

  FormulaStats complementBounded, complementShifted, cofform, parsumInf,
      pardiffSup, kvSup;
  int completabilityChecks = 0, completabilityMismatches = 0;
  int pardiffChecks = 0, pardiffMismatches = 0;

  if (suppliedA && suppliedB) {
    const PsdOperator a = make_psd(HermitianOperator(*suppliedA), pol);
    const Matrix& b = *suppliedB;
    IncompleteBlockSystem system(a, b);
    const bool completable = is_completable(system, pol);
    for (int i = 0; i < instances; ++i) {
      const Vector y = random_unit(static_cast<int>(b.rows()), rng);
      const auto boundedEst =
          oracle_sup(SupObjective::ComplementBounded, a.base().matrix(), b, y,
                     budget, pol, global.seed + 17 * i + 1);
      const auto shiftedEst =
          oracle_sup(SupObjective::ComplementShifted, a.base().matrix(), b, y,
                     budget, pol, global.seed + 17 * i + 2);
      ++completabilityChecks;
      if (completable == boundedEst.unbounded) ++completabilityMismatches;
      if (completable) {
        const double kernel =
            quadratic_value(complement(system, pol).base().matrix(), y);
        complementBounded.record(kernel, boundedEst);
        complementShifted.record(kernel, shiftedEst);
      }
    }
  } else {
    for (int i = 0; i < instances; ++i) {
      const int n = dimDist(rng);
      std::uniform_int_distribution<int> rankDist(1, n);

      // Completable pair: B = R A keeps ran B* inside ran A.
      {
        const int rank = rankDist(rng);
        const Matrix aMat = random_psd_matrix(n, rank, rng);
        const PsdOperator a = make_psd(HermitianOperator(aMat), pol);
        const Matrix b = random_gaussian(n, n, rng) * aMat;
        const Vector y = random_unit(n, rng);
        IncompleteBlockSystem system(a, b);
        const double kernel =
            quadratic_value(complement(system, pol).base().matrix(), y);
        complementBounded.record(
            kernel, oracle_sup(SupObjective::ComplementBounded, aMat, b, y,
                               budget, pol, global.seed + 31 * i + 1));
        complementShifted.record(
            kernel, oracle_sup(SupObjective::ComplementShifted, aMat, b, y,
                               budget, pol, global.seed + 31 * i + 2));

        ++completabilityChecks;
        const auto finiteVerdict =
            oracle_sup(SupObjective::ComplementBounded, aMat, b, y, budget,
                       pol, global.seed + 31 * i + 3);
        if (finiteVerdict.unbounded) ++completabilityMismatches;
        // Agreement must also hold on the shifted form.
        const auto shiftedVerdict =
            oracle_sup(SupObjective::ComplementShifted, aMat, b, y, budget,
                       pol, global.seed + 31 * i + 13);
        if (shiftedVerdict.unbounded) ++completabilityMismatches;
      }

      // Engineered leak outside ran A; the oracle must report an infinite
      // supremum exactly when the completability predicate refuses.
      if (n >= 2) {
        const int rank = n - 1;
        const Matrix aMat = random_psd_matrix(n, rank, rng);
        const PsdOperator a = make_psd(HermitianOperator(aMat), pol);
        const Vector nullDir = a.eigenvectors().col(0);
        const Vector u = random_unit(n, rng);
        const Matrix b =
            Matrix(random_gaussian(n, n, rng) * aMat + u * nullDir.adjoint());
        IncompleteBlockSystem system(a, b);
        ++completabilityChecks;
        const auto estimate =
            oracle_sup(SupObjective::ComplementBounded, aMat, b, u, budget,
                       pol, global.seed + 31 * i + 4);
        if (is_completable(system, pol) != !estimate.unbounded) {
          ++completabilityMismatches;
        }
      }

      // Both-positive pair on one space for the self-adjoint formula.
      {
        const int rank = rankDist(rng);
        const Matrix aMat = random_psd_matrix(n, rank, rng);
        const PsdOperator a = make_psd(HermitianOperator(aMat), pol);
        const Matrix proj = a.rangeProjector();
        const Matrix bMat =
            proj * random_psd_matrix(n, rankDist(rng), rng) * proj;
        const Vector y = random_unit(n, rng);
        IncompleteBlockSystem system(a, bMat);
        const double kernel =
            quadratic_value(complement(system, pol).base().matrix(), y);
        cofform.record(kernel,
                       oracle_sup(SupObjective::ComplementSelfAdjoint, aMat,
                                  bMat, y, budget, pol, global.seed + 31 * i + 5));
      }

      // Parallel sum (inf formula) on arbitrary positive pairs.
      {
        const Matrix aMat = random_psd_matrix(n, rankDist(rng), rng);
        const Matrix bMat = random_psd_matrix(n, rankDist(rng), rng);
        const Vector y = random_unit(n, rng);
        const PsdOperator sum = parallel_sum(make_psd(HermitianOperator(aMat), pol),
                                             make_psd(HermitianOperator(bMat), pol), pol);
        parsumInf.record(quadratic_value(sum.base().matrix(), y),
                         oracle_inf(aMat, bMat, y, budget, pol,
                                    global.seed + 31 * i + 6));
      }

      // Parallel difference: valid construction A = D + B with ran B in ran D.
      {
        const Matrix dMat = random_psd_matrix(n, rankDist(rng), rng);
        const PsdOperator d = make_psd(HermitianOperator(dMat), pol);
        const Matrix proj = d.rangeProjector();
        const Matrix bMat =
            proj * random_psd_matrix(n, rankDist(rng), rng) * proj;
        const Matrix aMat = dMat + bMat;
        const PsdOperator a = make_psd(HermitianOperator(aMat), pol);
        const PsdOperator b = make_psd(HermitianOperator(bMat), pol);
        const Vector y = random_unit(n, rng);
        const double kernel = quadratic_value(
            parallel_difference(b, a, pol).base().matrix(), y);
        const auto estimate =
            oracle_sup(SupObjective::ParallelDifference, bMat, aMat, y, budget,
                       pol, global.seed + 31 * i + 7);
        pardiffSup.record(kernel, estimate);
        ++pardiffChecks;
        if (estimate.unbounded) ++pardiffMismatches;
      }

      // Invalid parallel difference; the oracle must detect the blow-up.
      {
        const Matrix aMat = random_psd_matrix(n, n, rng);
        const PsdOperator a = make_psd(HermitianOperator(aMat), pol);
        const Vector y = random_unit(n, rng);
        const auto estimate = oracle_sup(SupObjective::ParallelDifference,
                                         aMat, aMat, y, budget, pol,
                                         global.seed + 31 * i + 8);
        ++pardiffChecks;
        const bool exists =
            pardiff_exists(a, a, pol);  // false: the supremum is infinite
        if (exists != !estimate.unbounded) ++pardiffMismatches;
      }

      // Krein-von Neumann quadratic form on a random restriction.
      {
        const int k = std::uniform_int_distribution<int>(1, n)(rng);
        const Matrix m = random_psd_matrix(n, n, rng);
        Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, k, rng));
        const Matrix v = qr.householderQ() * Matrix::Identity(n, k);
        const Matrix w = m * v;
        PartialPositiveOperator partial(n, v, w, pol);
        const KvExtension ext = krein_von_neumann(partial, pol);
        const Vector y = random_unit(n, rng);
        kvSup.record(quadratic_value(ext.extension.base().matrix(), y),
                     oracle_sup(SupObjective::KvExtensionBounded, v, w, y,
                                budget, pol, global.seed + 31 * i + 9));
      }
    }
  }

  const double allowed = 10.0 * pol.eqTol;
  bool ok = completabilityMismatches == 0 && pardiffMismatches == 0;
  for (const FormulaStats* s : {&complementBounded, &complementShifted,
                                &cofform, &parsumInf, &pardiffSup, &kvSup}) {
    ok = ok && s->maxDeviation <= allowed;
  }
  if (pass) *pass = ok;

  Json report;
  report["policy"] = policy_to_json(pol);
  report["seed"] = global.seed;
  report["budget"] = budget;
  report["allowedDeviation"] = allowed;
  report["formulas"] = Json{{"complementBounded", complementBounded.toJson()},
                            {"complementShifted", complementShifted.toJson()},
                            {"complementSelfAdjoint", cofform.toJson()},
                            {"parallelSumInf", parsumInf.toJson()},
                            {"parallelDifferenceSup", pardiffSup.toJson()},
                            {"kvExtensionSup", kvSup.toJson()}};
  report["verdicts"] =
      Json{{"completability",
            Json{{"instances", completabilityChecks},
                 {"mismatches", completabilityMismatches}}},
           {"parallelDifference", Json{{"instances", pardiffChecks},
                                       {"mismatches", pardiffMismatches}}}};
  report["pass"] = ok;
  return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"positive block completion, parallel operations, Lebesgue "
               "decomposition, and representable functionals"};
  app.name("opschur");

  GlobalOptions global;
  app.add_option("--tol-psd", global.pol.psdTol, "PSD acceptance tolerance");
  app.add_option("--tol-rank", global.pol.rankTol,
                 "rank cutoff (0 = dimension-scaled default)");
  app.add_option("--tol-eq", global.pol.eqTol, "matrix equality tolerance");
  app.add_option("--tol-lim", global.pol.limTol, "sequence convergence tolerance");
  app.add_option("--seed", global.seed, "random seed for verify");
  app.add_flag("--text", global.text, "human-readable summary instead of JSON");
  app.require_subcommand(1);

  std::string aPath, bPath, cPath, probesPath, inputPath;
  std::string algebraPath, functionalPath, fPath, gPath;
  double weight = 1.0;
  int instances = 100, maxDim = 5, budget = 200;

  auto* cmdComplement = app.add_subcommand(
      "complement", "minimal positive completion of [[A, B*], [B, *]]");
  cmdComplement->add_option("--a", aPath, "matrix A (JSON file)");
  cmdComplement->add_option("--b", bPath, "matrix B (JSON file)");
  cmdComplement->add_option("--probes", probesPath,
                            "JSON array of probe vectors");
  cmdComplement->add_option("--input", inputPath,
                            "combined document {a, b, probes?}");

  auto* cmdSchur = app.add_subcommand(
      "schur", "Schur complement of C in the completed block");
  cmdSchur->add_option("--a", aPath, "matrix A (JSON file)");
  cmdSchur->add_option("--b", bPath, "matrix B (JSON file)");
  cmdSchur->add_option("--c", cPath, "matrix C (JSON file)");
  cmdSchur->add_option("--input", inputPath, "combined document {a, b, c}");

  auto* cmdKvext = app.add_subcommand(
      "kvext", "smallest positive extension of a partial positive operator");
  cmdKvext->add_option("--input", inputPath,
                       "partial operator document {ambientDim, domainBasis, values}");

  auto* cmdParsum = app.add_subcommand("parsum", "parallel sum A : (weight B)");
  cmdParsum->add_option("--a", aPath, "matrix A (JSON file)");
  cmdParsum->add_option("--b", bPath, "matrix B (JSON file)");
  cmdParsum->add_option("--weight", weight, "positive weight on B");
  cmdParsum->add_option("--input", inputPath, "combined document {a, b, weight?}");

  auto* cmdPardiff = app.add_subcommand("pardiff", "parallel difference B / A");
  cmdPardiff->add_option("--a", aPath, "matrix A (JSON file)");
  cmdPardiff->add_option("--b", bPath, "matrix B (JSON file)");
  cmdPardiff->add_option("--input", inputPath, "combined document {a, b}");

  auto* cmdLebesgue = app.add_subcommand(
      "lebesgue", "Lebesgue-type decomposition of A with respect to B");
  cmdLebesgue->add_option("--a", aPath, "matrix A (JSON file)");
  cmdLebesgue->add_option("--b", bPath, "matrix B (JSON file)");
  cmdLebesgue->add_option("--input", inputPath, "combined document {a, b}");

  auto* cmdGns = app.add_subcommand("alg-gns",
                                    "GNS construction for a representable functional");
  cmdGns->add_option("--algebra", algebraPath, "algebra document (JSON file)");
  cmdGns->add_option("--functional", functionalPath, "functional document");
  cmdGns->add_option("--input", inputPath, "combined document {algebra, functional}");

  auto* cmdAlgComplement = app.add_subcommand(
      "alg-complement", "complement of a functional with respect to another");
  cmdAlgComplement->add_option("--algebra", algebraPath, "algebra document");
  cmdAlgComplement->add_option("--f", fPath, "carrier functional document");
  cmdAlgComplement->add_option("--g", gPath, "dominated functional document");
  cmdAlgComplement->add_option("--input", inputPath,
                               "combined document {algebra, f, g}");

  auto* cmdAlgLebesgue = app.add_subcommand(
      "alg-lebesgue", "Lebesgue decomposition of f with respect to g");
  cmdAlgLebesgue->add_option("--algebra", algebraPath, "algebra document");
  cmdAlgLebesgue->add_option("--f", fPath, "functional to decompose");
  cmdAlgLebesgue->add_option("--g", gPath, "weight functional");
  cmdAlgLebesgue->add_option("--input", inputPath,
                             "combined document {algebra, f, g}");

  auto* cmdVerify = app.add_subcommand(
      "verify", "cross-check closed-form kernels against the variational oracle");
  cmdVerify->add_option("--instances", instances, "instances per formula");
  cmdVerify->add_option("--dim", maxDim, "largest random dimension");
  cmdVerify->add_option("--budget", budget, "oracle iteration budget");
  cmdVerify->add_option("--a", aPath, "optional supplied matrix A");
  cmdVerify->add_option("--b", bPath, "optional supplied matrix B");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  std::vector<std::string> cliArgs(args.rbegin(), args.rend());
  try {
    app.parse(cliArgs);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help() << "\n";
      return 0;
    }
    err << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    global.pol.validate();
    Json report;
    std::optional<Json> inputDoc;
    if (!inputPath.empty()) inputDoc = load_doc(inputPath);

    auto docMatrix = [&](const char* key, const std::string& path) -> Matrix {
      if (inputDoc) {
        if (!inputDoc->contains(key)) {
          throw FormatError(std::string("input document is missing \"") + key + "\"");
        }
        return matrix_from_json(inputDoc->at(key));
      }
      if (path.empty()) {
        throw FormatError(std::string("missing --") + key + " (or --input)");
      }
      return load_matrix(path);
    };

    if (*cmdComplement) {
      const Matrix aMat = docMatrix("a", aPath);
      const Matrix bMat = docMatrix("b", bPath);
      std::vector<Vector> probes;
      Json probesDoc;
      if (inputDoc && inputDoc->contains("probes")) {
        probesDoc = inputDoc->at("probes");
      } else if (!probesPath.empty()) {
        probesDoc = load_doc(probesPath);
      }
      if (!probesDoc.is_null()) {
        if (!probesDoc.is_array()) {
          throw FormatError("probes must be an array of vectors");
        }
        for (const Json& p : probesDoc) probes.push_back(vector_from_json(p));
      }
      IncompleteBlockSystem system(make_psd(HermitianOperator(aMat), global.pol),
                                   bMat);
      const CompletionReport result =
          analyze_completion(system, probes, global.pol);
      report["completable"] = result.completable;
      report["policy"] = policy_to_json(global.pol);
      if (!result.completable) {
        report["reason"] = result.reason;
        emit(report, global, out);
        err << "system is not completable: " << result.reason << "\n";
        return 1;
      }
      report["complement"] = matrix_to_json(result.complement->base().matrix());
      if (!result.bestConstants.empty()) {
        Json constants = Json::array();
        for (const auto& pc : result.bestConstants) {
          constants.push_back(Json{{"probe", vector_to_json(pc.probe)},
                                   {"value", pc.value}});
        }
        report["bestConstants"] = std::move(constants);
      }
      emit(report, global, out);
      return 0;
    }

    if (*cmdSchur) {
      const Matrix aMat = docMatrix("a", aPath);
      const Matrix bMat = docMatrix("b", bPath);
      const Matrix cMat = docMatrix("c", cPath);
      IncompleteBlockSystem system(make_psd(HermitianOperator(aMat), global.pol),
                                   bMat);
      const PsdOperator c = make_psd(HermitianOperator(cMat), global.pol);
      const HermitianOperator schur = schur_complement(system, c, global.pol);
      report["schur"] = matrix_to_json(schur.matrix());
      report["complement"] =
          matrix_to_json(complement(system, global.pol).base().matrix());
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdKvext) {
      if (!inputDoc) throw FormatError("kvext requires --input");
      const PartialPositiveOperator partial =
          partial_operator_from_json(*inputDoc, global.pol);
      const KvExtension ext = krein_von_neumann(partial, global.pol);
      report["extension"] = matrix_to_json(ext.extension.base().matrix());
      report["gram"] = matrix_to_json(ext.gram);
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdParsum) {
      const Matrix aMat = docMatrix("a", aPath);
      const Matrix bMat = docMatrix("b", bPath);
      if (inputDoc && inputDoc->contains("weight")) {
        weight = inputDoc->at("weight").get<double>();
      }
      const PsdOperator a = make_psd(HermitianOperator(aMat), global.pol);
      const PsdOperator b = make_psd(HermitianOperator(bMat), global.pol);
      const PsdOperator sum = weight == 1.0
                                  ? parallel_sum(a, b, global.pol)
                                  : weighted_parallel_sum(a, b, weight, global.pol);
      report["parallelSum"] = matrix_to_json(sum.base().matrix());
      report["weight"] = weight;
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdPardiff) {
      const Matrix aMat = docMatrix("a", aPath);
      const Matrix bMat = docMatrix("b", bPath);
      const PsdOperator a = make_psd(HermitianOperator(aMat), global.pol);
      const PsdOperator b = make_psd(HermitianOperator(bMat), global.pol);
      const PsdOperator diff = parallel_difference(b, a, global.pol);
      report["parallelDifference"] = matrix_to_json(diff.base().matrix());
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdLebesgue) {
      const Matrix aMat = docMatrix("a", aPath);
      const Matrix bMat = docMatrix("b", bPath);
      const PsdOperator a = make_psd(HermitianOperator(aMat), global.pol);
      const PsdOperator b = make_psd(HermitianOperator(bMat), global.pol);
      const LebesgueSplit split = lebesgue_decompose(a, b, global.pol);
      report["regular"] = matrix_to_json(split.regular.base().matrix());
      report["singular"] = matrix_to_json(split.singular.base().matrix());
      report["routes"] =
          Json{{"iterativeLimit", matrix_to_json(split.routes.iterativeLimit)},
               {"viaParallelDifference",
                matrix_to_json(split.routes.viaParallelDifference)},
               {"viaComplement", matrix_to_json(split.routes.viaComplement)},
               {"maxPairwiseDeviation", split.routes.maxPairwiseDeviation},
               {"converged", split.routes.converged}};
      report["iterations"] = split.routes.iterations;
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    auto docSub = [&](const char* key, const std::string& path) -> Json {
      if (inputDoc) {
        if (!inputDoc->contains(key)) {
          throw FormatError(std::string("input document is missing \"") + key + "\"");
        }
        return inputDoc->at(key);
      }
      if (path.empty()) {
        throw FormatError(std::string("missing --") + key + " (or --input)");
      }
      return load_doc(path);
    };

    if (*cmdGns) {
      const AlgebraPtr algebra =
          algebra_from_json(docSub("algebra", algebraPath), global.pol);
      const Functional f =
          functional_from_json(docSub("functional", functionalPath), algebra);
      const GnsTriple triple = gns(f, global.pol);
      report["hilbertDim"] = triple.hilbertDim;
      report["gram"] = matrix_to_json(triple.gram);
      Json reps = Json::array();
      for (const Matrix& r : triple.repMatrices) reps.push_back(matrix_to_json(r));
      report["repMatrices"] = std::move(reps);
      report["cyclic"] = vector_to_json(triple.cyclic);
      report["cyclicNormSq"] = triple.cyclicNormSq;
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdAlgComplement) {
      const AlgebraPtr algebra =
          algebra_from_json(docSub("algebra", algebraPath), global.pol);
      const Functional f = functional_from_json(docSub("f", fPath), algebra);
      const Functional g = functional_from_json(docSub("g", gPath), algebra);
      const Functional h = complement_functional(f, g, global.pol);
      report["complement"] = functional_to_json(h);
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdAlgLebesgue) {
      const AlgebraPtr algebra =
          algebra_from_json(docSub("algebra", algebraPath), global.pol);
      const Functional f = functional_from_json(docSub("f", fPath), algebra);
      const Functional g = functional_from_json(docSub("g", gPath), algebra);
      const auto [regular, singular] =
          lebesgue_decompose_functional(f, g, global.pol);
      report["regular"] = functional_to_json(regular);
      report["singular"] = functional_to_json(singular);
      report["policy"] = policy_to_json(global.pol);
      emit(report, global, out);
      return 0;
    }

    if (*cmdVerify) {
      std::optional<Matrix> suppliedA, suppliedB;
      if (!aPath.empty() && !bPath.empty()) {
        suppliedA = load_matrix(aPath);
        suppliedB = load_matrix(bPath);
      } else if (!aPath.empty() || !bPath.empty()) {
        throw FormatError("verify needs both --a and --b or neither");
      }
      bool pass = false;
      report = run_verify(instances, maxDim, budget, global, suppliedA,
                          suppliedB, &pass);
      emit(report, global, out);
      if (!pass) {
        err << "verification failed: kernel/oracle disagreement\n";
        return 1;
      }
      return 0;
    }

    err << "no subcommand selected\n";
    return 2;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    out << Json{{"error", "FormatError"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    err << "input error: " << e.what() << "\n";
    out << Json{{"error", "DimensionMismatch"}, {"message", e.what()}}.dump(2)
        << "\n";
    return 2;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << "\n";
    out << Json{{"error", error_kind(e)}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    out << Json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump(2)
        << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace opschur::cli
