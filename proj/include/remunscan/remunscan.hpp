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

#pragma once

#include "remunscan/calendar.hpp"
#include "remunscan/config.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/detect.hpp"
#include "remunscan/error.hpp"
#include "remunscan/eval.hpp"
#include "remunscan/explorer.hpp"
#include "remunscan/ingest.hpp"
#include "remunscan/model.hpp"
#include "remunscan/money.hpp"
#include "remunscan/profile.hpp"
#include "remunscan/report.hpp"
#include "remunscan/stats.hpp"
#include "remunscan/store.hpp"
#include "remunscan/synth.hpp"
