// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(qubot::cli::run(std::env::args_os()));
}
