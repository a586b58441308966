# Copyright 2026 The FedOwen Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Contribution valuation estimators and a desk-scale federated-learning simulator."""

from ._core import (
    BudgetExhausted,
    FedOwenError,
    Game,
    additive_game,
    default_config,
    estimate,
    estimator_ids,
    exact_banzhaf,
    exact_shapley,
    normalize_config,
    read_idx,
    run_experiment,
    select_clients,
    shapfed_wa_weights,
    softmax_weights,
    standard_game,
    standard_game_names,
    table_game,
)

__all__ = [
    "BudgetExhausted",
    "FedOwenError",
    "Game",
    "additive_game",
    "default_config",
    "estimate",
    "estimator_ids",
    "exact_banzhaf",
    "exact_shapley",
    "normalize_config",
    "read_idx",
    "run_experiment",
    "select_clients",
    "shapfed_wa_weights",
    "softmax_weights",
    "standard_game",
    "standard_game_names",
    "table_game",
]

__version__ = "0.1.0"
