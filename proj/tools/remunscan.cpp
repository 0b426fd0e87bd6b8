/*
 * Copyright 2026 The remunscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "remunscan/cli.hpp"

int main(int argc, char** argv) {
  namespace rc = remunscan::cli;
  CLI::App app{"remunscan: detect salary-like payment patterns in transaction histories"};
  app.require_subcommand(1);

  rc::IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate transactions and rates into a store directory");
  ingest_cmd->add_option("--txs", ingest.txs, "transactions.jsonl files")->required()->expected(1, -1);
  ingest_cmd->add_option("--rates", ingest.rates, "rates.csv (date,usd_per_btc)");
  ingest_cmd->add_option("--out", ingest.out, "store directory")->required();
  ingest_cmd->add_flag("--strict", ingest.strict, "abort on the first rejected line");

  rc::DetectOptions detect;
  auto* detect_cmd = app.add_subcommand("detect", "Score every source in a store");
  detect_cmd->add_option("--store", detect.store)->required();
  detect_cmd->add_option("--config", detect.config, "config JSON (falls back to $REMUNSCAN_CONFIG)");
  detect_cmd->add_option("--window", detect.window, "FROM:TO, dates as YYYY-MM-DD");
  detect_cmd->add_option("--out", detect.out, "report.json")->required();
  detect_cmd->add_option("--jobs", detect.jobs, "worker threads")->check(CLI::PositiveNumber);

  rc::ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Emit plot data for one source as CSV");
  report_cmd->add_option("--store", report.store)->required();
  report_cmd->add_option("--source", report.source)->required();
  report_cmd->add_option("--fig", report.fig, "daily-histogram | reuse | median-series")->required();
  report_cmd->add_option("--bucket", report.bucket, "median-series bucket width in days (default 30)");
  report_cmd->add_option("--out", report.out)->required();

  rc::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  synth_cmd->add_option("--scenario", synth.scenario, "payroll | noise | lifecycle | reuse")->required();
  synth_cmd->add_option("--params", synth.params, "scenario params JSON")->required();
  synth_cmd->add_option("--seed", synth.seed)->required();
  synth_cmd->add_option("--out-txs", synth.out_txs)->required();
  synth_cmd->add_option("--out-labels", synth.out_labels)->required();

  rc::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a report against synthetic labels");
  eval_cmd->add_option("--report", eval.report)->required();
  eval_cmd->add_option("--labels", eval.labels)->required();
  eval_cmd->add_option("--out", eval.out, "metrics.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rc::kUserError;
  }

  if (*ingest_cmd) return rc::cmd_ingest(ingest, std::cout, std::cerr);
  if (*detect_cmd) return rc::cmd_detect(detect, std::cout, std::cerr);
  if (*report_cmd) return rc::cmd_report(report, std::cout, std::cerr);
  if (*synth_cmd) return rc::cmd_synth(synth, std::cout, std::cerr);
  if (*eval_cmd) return rc::cmd_eval(eval, std::cout, std::cerr);
  return rc::kUserError;
}
