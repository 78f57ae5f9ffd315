import { escapeXml, renderGraphSvg, renderRuleDiagrams } from './render.js';
import type { ExplorerState } from './store.js';
import type { ReportDto, StageDto, TileInfo, TileReportDto } from './types.js';

const CLASS_NAMES: Record<string, string> = {
  h: 'ALL HOMOMORPHISMS',
  m: 'MONOS only',
  r: 'REGULAR MONOS only',
};

export function describeClass(letter: string): string {
  return CLASS_NAMES[letter] ?? letter;
}

function tileByName(tiles: TileInfo[], name: string): TileInfo | undefined {
  return tiles.find((t) => t.name === name);
}

export function renderCatalogue(state: ExplorerState): string {
  const rows = state.systems
    .map(
      (s) => `
      <tr>
        <td class="mono">${s.id}</td>
        <td>${escapeXml(s.name)}</td>
        <td>${s.ruleCount}</td>
        <td><button data-action="open-system" data-id="${s.id}" ${state.busy ? 'disabled' : ''}>prove</button></td>
      </tr>`,
    )
    .join('');
  const tiles = state.tiles
    .map(
      (t) => `
      <figure class="tile-card">
        <figcaption><span class="mono">${t.id}</span> ${escapeXml(t.name)}</figcaption>
        ${renderGraphSvg(t.graph, { figureId: `tile-${t.id}` })}
      </figure>`,
    )
    .join('');
  return `
    <section class="catalogue">
      <h2>Systems</h2>
      <table class="systems">
        <thead><tr><th>#</th><th>name</th><th>rules</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <h2>Tiles</h2>
      <div class="tile-grid">${tiles}</div>
    </section>`;
}

function renderTileReport(tile: TileReportDto): string {
  const counters: [string, keyof TileReportDto][] = [
    ["# morphisms into R':", 'homIntoR1'],
    ['# of which valid:', 'valid'],
    ['# iso in R:', 'isoInR'],
    ['# noniso in R:', 'nonisoInR'],
    ['# number of ways to slide:', 'waysToSlide'],
    ['largest valid tiling of L:', 'deltaSize'],
  ];
  const rows = counters
    .map(
      ([label, key]) =>
        `<tr><th>${escapeXml(label)}</th><td class="mono" data-counter="${key}">${tile[key]}</td></tr>`,
    )
    .join('');
  return `
    <div class="tile-report">
      <h5>Tile ${escapeXml(tile.tile)}, weight ${tile.weight}, counting ${escapeXml(describeClass(tile.class))}</h5>
      ${renderGraphSvg(tile.graph, { figureId: `report-${tile.tile}` })}
      <table class="counters">${rows}</table>
    </div>`;
}

export function renderReport(report: ReportDto): string {
  const badge = `<span class="badge ${report.status.toLowerCase()}" data-verdict="${report.status}">${report.status}</span>`;
  const failure = report.slideFailure
    ? `<p class="slide-failure">sliding failed: ${escapeXml(report.slideFailure)}</p>`
    : '';
  const notes = report.notes.map((n) => `<p class="note">${escapeXml(n)}</p>`).join('');
  return `
    <article class="report" data-rule="${escapeXml(report.rule)}">
      <h4>rule ${escapeXml(report.rule)} ${badge}</h4>
      <p class="weights">weight of Delta: <strong data-counter="deltaWeight">${report.deltaWeight}</strong>,
         weight of R: <strong data-counter="rWeight">${report.rWeight}</strong></p>
      ${failure}${notes}
      ${report.tiles.map(renderTileReport).join('')}
    </article>`;
}

export function renderStage(stage: StageDto, index: number): string {
  const entries = stage.entries
    .map((e) => `${escapeXml(e.tile)} (w ${e.weight}, ${e.class})`)
    .join(', ');
  const pruned = stage.pruned.length
    ? `pruned: ${stage.pruned.map(escapeXml).join(', ')}`
    : 'nothing pruned';
  return `
    <section class="stage" data-stage="${index}">
      <h3>Stage ${index + 1} <span class="entries">${entries}</span></h3>
      ${stage.reports.map(renderReport).join('')}
      <p class="prune">${pruned}; remaining: ${
        stage.remaining.length ? stage.remaining.map(escapeXml).join(', ') : 'none'
      }</p>
    </section>`;
}

function renderDraft(state: ExplorerState): string {
  const options = (selected: number) =>
    state.tiles
      .map(
        (t) =>
          `<option value="${t.id}" ${t.id === selected ? 'selected' : ''}>${t.id} ${escapeXml(t.name)}</option>`,
      )
      .join('');
  const classOption = (letter: string, selected: string) =>
    `<option value="${letter}" ${letter === selected ? 'selected' : ''}>${escapeXml(describeClass(letter))}</option>`;
  const rows = state.draft
    .map(
      (row, index) => `
      <tr class="draft-row" data-row="${index}">
        <td><select data-action="set-tile" data-row="${index}">${options(row.tileId)}</select></td>
        <td><input data-action="set-weight" data-row="${index}" type="number" min="1" step="1" value="${row.weight}"></td>
        <td><select data-action="set-class" data-row="${index}">
          ${classOption('h', row.klass)}${classOption('m', row.klass)}${classOption('r', row.klass)}
        </select></td>
        <td><button data-action="remove-row" data-row="${index}">remove</button></td>
      </tr>`,
    )
    .join('');
  const locked = state.busy || state.session?.terminated;
  return `
    <div class="draft">
      <table><tbody>${rows}</tbody></table>
      <button data-action="add-row" ${locked ? 'disabled' : ''}>add tile</button>
      <button data-action="run" class="primary" ${locked || state.draft.length === 0 ? 'disabled' : ''}>analyze</button>
    </div>`;
}

export function renderProof(state: ExplorerState): string {
  const system = state.system;
  const session = state.session;
  if (!system || !session) return '<p class="error">no system selected</p>';
  const remaining = session.remaining.length
    ? session.remaining.map((r) => `<span class="rule-chip">${escapeXml(r)}</span>`).join(' ')
    : '<em>none</em>';
  const banner = session.terminated
    ? `<div class="banner terminating">You have proven system ${escapeXml(system.name)} terminating.</div>`
    : '';
  const error = state.error ? `<div class="error-box">${escapeXml(state.error)}</div>` : '';
  const rules = system.rules
    .map(
      (rule) => `
      <details class="rule" ${system.rules.length === 1 ? 'open' : ''}>
        <summary>rule ${escapeXml(rule.name)}</summary>
        ${renderRuleDiagrams(rule)}
      </details>`,
    )
    .join('');
  const canExport = state.stages.length > 0;
  const stageHistory = state.stages
    .map((stage, index) => renderStage(stage, index))
    .reverse()
    .join('');
  return `
    <section class="proof">
      <header>
        <button data-action="back">back to systems</button>
        <h2>${escapeXml(system.name)}</h2>
        <span class="busy" ${state.busy ? '' : 'hidden'}>working…</span>
      </header>
      ${banner}${error}
      <p class="remaining">remaining rules: ${remaining}</p>
      ${rules}
      <h3>New stage</h3>
      ${renderDraft(state)}
      <div class="session-actions">
        <button data-action="undo" ${state.busy || state.stages.length === 0 ? 'disabled' : ''}>undo stage</button>
        <button data-action="export-script" ${canExport ? '' : 'disabled'}>export batch script</button>
        <button data-action="export-json" ${canExport ? '' : 'disabled'}>export JSON</button>
      </div>
      ${stageHistory}
    </section>`;
}

export function renderApp(state: ExplorerState): string {
  const body = state.view === 'proof' ? renderProof(state) : renderCatalogue(state);
  const catalogueError =
    state.view === 'catalogue' && state.error
      ? `<div class="error-box">${escapeXml(state.error)}</div>`
      : '';
  return `
    <header class="top">
      <h1>tileterm proof explorer</h1>
      <p class="tagline">prove graph rewrite systems terminating by weighted tile counting</p>
    </header>
    ${catalogueError}${body}`;
}
