#pragma once

namespace zubov {

/// Entry point behind the `zubov` binary: subcommands train, fdm, eval,
/// contour, diff, gradcheck. Returns 0 on success, 1 on runtime failure,
/// 2 on usage errors (including a missing subcommand).
int cli_main(int argc, const char* const* argv);

}  // namespace zubov
