import { describe, expect, it } from 'vitest';

import { contextElements, renderGraphSvg, renderRuleDiagrams } from '../src/render.js';
import type { GraphDto, MorphismDto, RuleDto } from '../src/types.js';

const edgeGraph: GraphDto = {
  vertices: [
    { id: 'x', label: '0' },
    { id: 'y', label: '0' },
  ],
  edges: [{ id: 'XY', src: 'x', tgt: 'y', label: '0' }],
};

// x:0 -P-> y:0 typed into x, y, context vertex c with extra edges.
const primeGraph: GraphDto = {
  vertices: [
    { id: 'c', label: '0' },
    { id: 'x', label: '0' },
    { id: 'y', label: '0' },
  ],
  edges: [
    { id: 'CC', src: 'c', tgt: 'c', label: '0' },
    { id: 'P', src: 'x', tgt: 'y', label: '0' },
    { id: 'XC', src: 'x', tgt: 'c', label: '0' },
  ],
};

const typing: MorphismDto = {
  vertices: { x: 'x', y: 'y' },
  edges: { P: 'P' },
};

describe('contextElements', () => {
  it('collects everything outside the image', () => {
    const ctx = contextElements(primeGraph, typing);
    expect([...ctx.vertices]).toEqual(['c']);
    expect([...ctx.edges].sort()).toEqual(['CC', 'XC']);
  });

  it('is empty for an identity-like typing', () => {
    const identity: MorphismDto = {
      vertices: { x: 'x', y: 'y' },
      edges: { XY: 'XY' },
    };
    const ctx = contextElements(edgeGraph, identity);
    expect(ctx.vertices.size).toBe(0);
    expect(ctx.edges.size).toBe(0);
  });
});

describe('renderGraphSvg', () => {
  it('emits one node and one edge element per graph element', () => {
    const svg = renderGraphSvg(edgeGraph);
    expect(svg.match(/data-vertex=/g)).toHaveLength(2);
    expect(svg.match(/data-edge=/g)).toHaveLength(1);
    expect(svg).toContain('x:0');
    expect(svg).toContain('XY:0');
    expect(svg).toContain('marker-end');
  });

  it('marks context elements dotted and pattern elements solid', () => {
    const ctx = contextElements(primeGraph, typing);
    const svg = renderGraphSvg(primeGraph, { context: ctx });
    expect(svg).toContain('class="vertex context" data-vertex="c"');
    expect(svg).toContain('class="vertex pattern" data-vertex="x"');
    expect(svg).toContain('class="edge context" data-edge="XC"');
    expect(svg).toContain('class="edge pattern" data-edge="P"');
  });

  it('renders loops as circles', () => {
    const loop: GraphDto = {
      vertices: [{ id: 'v', label: '0' }],
      edges: [{ id: 'L', src: 'v', tgt: 'v', label: 'a' }],
    };
    const svg = renderGraphSvg(loop);
    expect(svg).toContain('<circle class="edge pattern" data-edge="L"');
  });

  it('escapes labels', () => {
    const nasty: GraphDto = {
      vertices: [{ id: 'v', label: '<script>' }],
      edges: [],
    };
    const svg = renderGraphSvg(nasty);
    expect(svg).toContain('v:&lt;script&gt;');
    expect(svg).not.toContain('<script>');
  });

  it('is byte-deterministic', () => {
    expect(renderGraphSvg(primeGraph, { figureId: 'p' })).toBe(
      renderGraphSvg(primeGraph, { figureId: 'p' }),
    );
  });
});

describe('renderRuleDiagrams', () => {
  const rule: RuleDto = {
    name: 'demo',
    graphs: {
      L: edgeGraph,
      K: { vertices: edgeGraph.vertices, edges: [] },
      R: edgeGraph,
      LPrime: primeGraph,
      KPrime: primeGraph,
      RPrime: primeGraph,
    },
    morphisms: {
      l: { vertices: { x: 'x', y: 'y' }, edges: {} },
      r: { vertices: { x: 'x', y: 'y' }, edges: {} },
      tL: typing,
      tK: { vertices: { x: 'x', y: 'y' }, edges: {} },
      tR: typing,
      lPrime: { vertices: {}, edges: {} },
      rPrime: { vertices: {}, edges: {} },
    },
  };

  it('shows all six diagrams in order', () => {
    const html = renderRuleDiagrams(rule);
    const captions = [...html.matchAll(/<figcaption>([^<]+)<\/figcaption>/g)].map(
      (m) => m[1],
    );
    expect(captions).toEqual(['L', 'K', 'R', "L'", "K'", "R'"]);
  });

  it('styles only the primed graphs with context', () => {
    const html = renderRuleDiagrams(rule);
    const figures = html.split('<figure');
    const plain = figures.slice(1, 4).join('');
    const primed = figures.slice(4).join('');
    expect(plain).not.toContain('context');
    expect(primed).toContain('class="vertex context"');
  });
});
