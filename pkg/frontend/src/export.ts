import type { SessionDto, StageDto } from './types.js';

/** Rebuild the session as a batch script.
 *
 * Ids in the API match the REPL listing indices, so the emitted commands
 * replay verbatim through `tileterm batch`; completed proofs assert
 * themselves with `expect terminating`.
 */
export function buildBatchScript(
  systemId: number,
  systemName: string,
  stages: StageDto[],
): string {
  const lines = [`# tileterm proof transcript: ${systemName}`, `select ${systemId}`];
  for (const stage of stages) {
    const triples = stage.entries.map((e) => `${e.tileId} ${e.weight} ${e.class}`);
    lines.push(`use ${triples.join(' ')}`);
  }
  const terminated = stages.length > 0 && stages[stages.length - 1]!.terminated;
  if (terminated) lines.push('expect terminating');
  lines.push('exit');
  return lines.join('\n') + '\n';
}

/** The full session history as pretty JSON, for archiving next to the script. */
export function buildTranscriptJson(session: SessionDto, stages: StageDto[]): string {
  return (
    JSON.stringify(
      {
        system: session.system,
        systemId: session.systemId,
        sessionId: session.sessionId,
        terminated: stages.length > 0 && stages[stages.length - 1]!.terminated,
        stages,
      },
      null,
      2,
    ) + '\n'
  );
}
