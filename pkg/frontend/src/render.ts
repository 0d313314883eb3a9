/** DOM rendering.  Deduced outcomes always carry a distinct badge and
 * color; the asked/deduced distinction is never collapsed. */

import { feedLine, questionText, remaining, savingsText } from './state.js';
import type { SessionView } from './state.js';

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderCounters(root: HTMLElement, view: SessionView): void {
  root.replaceChildren(
    counter('asked', view.asked),
    counter('deduced', view.deduced),
    counter('remaining', remaining(view)),
  );
}

function counter(label: string, value: number): HTMLElement {
  const box = el('div', `counter counter-${label}`);
  box.append(el('div', 'counter-value', String(value)),
             el('div', 'counter-label', label));
  return box;
}

export function renderQuestion(root: HTMLElement, view: SessionView,
                               onAnswer: (label: 'match' | 'nonmatch') => void): void {
  root.replaceChildren();
  if (view.done) {
    root.append(el('p', 'done-line', 'All pairs are labeled.'));
    return;
  }
  if (!view.pending) {
    return;
  }
  const card = el('div', 'question-card');
  card.append(el('p', 'question-text', questionText(view.pending)));
  card.append(el('p', 'question-prob',
                 `prior match probability ${view.pending.p}`));
  const buttons = el('div', 'answer-buttons');
  const match = el('button', 'answer answer-match', 'Match');
  const nonmatch = el('button', 'answer answer-nonmatch', 'No match');
  match.disabled = nonmatch.disabled = view.inFlight;
  match.addEventListener('click', () => onAnswer('match'));
  nonmatch.addEventListener('click', () => onAnswer('nonmatch'));
  buttons.append(match, nonmatch);
  card.append(buttons);
  root.append(card);
}

export function renderFeed(root: HTMLElement, view: SessionView): void {
  root.replaceChildren();
  for (const entry of [...view.feed].reverse()) {
    const item = el('li', `feed-item feed-${entry.outcome}`);
    item.append(el('span', `badge badge-${entry.outcome}`, entry.outcome),
                el('span', 'feed-text', feedLine(entry)));
    root.append(item);
  }
}

/** Grouped-node cluster view: one box per cluster, dashed SVG edges
 * between boxes that are known non-matches.  No physics, just flexbox
 * plus line endpoints read back from the layout. */
export function renderClusters(boxRoot: HTMLElement, svg: SVGSVGElement,
                               view: SessionView): void {
  boxRoot.replaceChildren();
  const boxByMin = new Map<string, HTMLElement>();
  for (const cluster of view.clusters) {
    const box = el('div', cluster.length > 1 ? 'cluster cluster-merged' : 'cluster');
    for (const rid of cluster) {
      box.append(el('span', 'record-chip', rid));
    }
    boxRoot.append(box);
    boxByMin.set(cluster[0], box);
  }
  drawNonmatchEdges(boxRoot, svg, view, boxByMin);
}

function drawNonmatchEdges(boxRoot: HTMLElement, svg: SVGSVGElement,
                           view: SessionView,
                           boxByMin: Map<string, HTMLElement>): void {
  svg.replaceChildren();
  const host = boxRoot.getBoundingClientRect();
  svg.setAttribute('width', String(host.width));
  svg.setAttribute('height', String(host.height));
  for (const [x, y] of view.nonmatchEdges) {
    const from = boxByMin.get(x);
    const to = boxByMin.get(y);
    if (!from || !to) {
      continue;
    }
    const a = from.getBoundingClientRect();
    const b = to.getBoundingClientRect();
    const line = document.createElementNS('http://www.w3.org/2000/svg', 'line');
    line.setAttribute('x1', String(a.left + a.width / 2 - host.left));
    line.setAttribute('y1', String(a.top + a.height / 2 - host.top));
    line.setAttribute('x2', String(b.left + b.width / 2 - host.left));
    line.setAttribute('y2', String(b.top + b.height / 2 - host.top));
    line.setAttribute('class', 'nonmatch-edge');
    svg.append(line);
  }
}

export function renderSummary(root: HTMLElement, view: SessionView,
                              onDownload: () => void,
                              onRestart: () => void): void {
  root.replaceChildren();
  if (!view.done) {
    root.hidden = true;
    return;
  }
  root.hidden = false;
  root.append(el('h2', undefined, 'Session complete'));
  root.append(el('p', 'savings', savingsText(view)));
  root.append(el('p', undefined,
                 `${view.asked} asked, ${view.deduced} deduced, `
                 + `${view.clusters.length} cluster(s)`));
  const download = el('button', 'secondary', 'Download trace');
  download.addEventListener('click', onDownload);
  const restart = el('button', 'secondary', 'New session');
  restart.addEventListener('click', onRestart);
  const row = el('div', 'summary-actions');
  row.append(download, restart);
  root.append(row);
}

export function renderNotice(root: HTMLElement, view: SessionView): void {
  root.textContent = view.notice ?? '';
  root.hidden = view.notice === null;
}
