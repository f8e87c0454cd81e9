// Pure view-model construction: no DOM, no network, no derived analytics.
// Cell values pass through untouched; the only computation is presentation
// scaling (per-panel max normalization of color intensity).

import type { GridCell, TopicGridSet, WindowRange } from "./api.js";

export const CHANNELS = [
  "current",
  "self_history",
  "self_risk",
  "peer_history",
  "peer_risk",
] as const;

export type Channel = (typeof CHANNELS)[number];

export const CHANNEL_TITLES: Record<Channel, string> = {
  current: "current",
  self_history: "self history",
  self_risk: "self risk",
  peer_history: "peer history",
  peer_risk: "peer risk",
};

export interface PanelCell {
  k: number;
  col: number;
  row: number;
  label: string;
  value: number; // verbatim server value
  intensity: number; // value / panel max, 0 for an all-zero panel
}

export interface Panel {
  channel: Channel;
  title: string;
  max: number;
  cells: PanelCell[];
}

export interface GridViewModel {
  user: string;
  window: WindowRange;
  h: number;
  side: number;
  panels: Panel[];
  selectedChannel: Channel;
}

export function buildViewModel(
  grids: TopicGridSet,
  selectedChannel: Channel = "self_risk",
): GridViewModel {
  // one shared cell order for every panel: ascending topic index
  const ordered = [...grids.cells].sort((a, b) => a.k - b.k);
  const panels = CHANNELS.map((channel) => buildPanel(channel, ordered));
  return {
    user: grids.user,
    window: grids.window,
    h: grids.h,
    side: 2 ** grids.h,
    panels,
    selectedChannel,
  };
}

function buildPanel(channel: Channel, cells: GridCell[]): Panel {
  const max = cells.reduce((m, c) => Math.max(m, c[channel]), 0);
  return {
    channel,
    title: CHANNEL_TITLES[channel],
    max,
    cells: cells.map((c) => ({
      k: c.k,
      col: c.col,
      row: c.row,
      label: c.label,
      value: c[channel],
      intensity: max > 0 ? c[channel] / max : 0,
    })),
  };
}

const ACTIVITY_RGB = "31,119,180";
const RISK_RGB = "214,39,40";

/** Single-hue ramp per panel kind; zero intensity is the page background. */
export function cellBackground(channel: Channel, intensity: number): string {
  if (intensity <= 0) return "transparent";
  const rgb = channel.endsWith("risk") ? RISK_RGB : ACTIVITY_RGB;
  return `rgba(${rgb},${intensity.toFixed(4)})`;
}

export function describeWindow(window: WindowRange): string {
  return `${window.start} to ${window.end}`;
}

/** Candidate windows for the dropdown: the snapshot window plus earlier
 *  same-length windows back to the benchmark start. */
export function windowChoices(
  snapshotWindow: WindowRange,
  benchmarkStart: string,
  maxChoices = 10,
): { label: string; value: WindowRange | null }[] {
  const choices: { label: string; value: WindowRange | null }[] = [
    { label: `snapshot window (${describeWindow(snapshotWindow)})`, value: null },
  ];
  const length = Date.parse(snapshotWindow.end) - Date.parse(snapshotWindow.start);
  const floor = Date.parse(benchmarkStart);
  let start = Date.parse(snapshotWindow.start);
  while (choices.length < maxChoices && start - length >= floor) {
    start -= length;
    const range = { start: isoSeconds(start), end: isoSeconds(start + length) };
    choices.push({ label: describeWindow(range), value: range });
  }
  return choices;
}

function isoSeconds(epochMs: number): string {
  return new Date(epochMs).toISOString().replace(/\.\d{3}Z$/, "Z");
}
