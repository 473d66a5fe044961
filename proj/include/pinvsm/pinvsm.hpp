/*
 * Copyright 2026 The pinvsm-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "pinvsm/alu.hpp"
#include "pinvsm/array.hpp"
#include "pinvsm/baseline.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/config.hpp"
#include "pinvsm/counters.hpp"
#include "pinvsm/dpu.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/hash.hpp"
#include "pinvsm/ingest.hpp"
#include "pinvsm/isa.hpp"
#include "pinvsm/nvm.hpp"
#include "pinvsm/record.hpp"
#include "pinvsm/schedule.hpp"
#include "pinvsm/session.hpp"
#include "pinvsm/snapshot.hpp"
#include "pinvsm/table.hpp"
