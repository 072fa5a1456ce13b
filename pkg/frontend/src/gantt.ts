import type { ChoiceResult } from "./types.js";

// Gantt view of a committed schedule.  Bars start at the server's early-start
// figure; the hatched tail shades the slack window (early finish up to late
// finish).  Nothing here derives a number — positions are the service values
// times one pixels-per-hour scale.

const CHART_W = 640;
const LABEL_W = 110;
const ROW_H = 30;
const BAR_H = 18;
const FOOTER = 64;

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSchedule(result: ChoiceResult): string {
  const schedule = result.schedule;
  const relaxation = result.relaxation;
  const rows = [...schedule.activities].sort(
    (a, b) => a.early_start - b.early_start || a.id.localeCompare(b.id),
  );
  const hours = Math.max(schedule.makespan, 1e-9);
  const scale = CHART_W / hours;
  const height = rows.length * ROW_H + FOOTER;
  const width = LABEL_W + CHART_W + 20;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" class="gantt" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">`,
  ];

  rows.forEach((activity, index) => {
    const y = index * ROW_H + (ROW_H - BAR_H) / 2;
    const x = LABEL_W + activity.early_start * scale;
    const w = Math.max(activity.duration * scale, 2);
    const critical = activity.slack === 0;
    const classes = critical ? "bar critical" : "bar";
    parts.push(
      `<g class="row" data-activity="${escapeXml(activity.id)}">`,
      `<title>${escapeXml(
        `${activity.label}: start ${activity.early_start} h, ` +
          `duration ${activity.duration} h, slack ${activity.slack} h`,
      )}</title>`,
      `<text class="name" x="${LABEL_W - 8}" y="${y + BAR_H - 5}">${escapeXml(activity.id)}</text>`,
      `<rect class="${classes}" x="${x}" y="${y}" width="${w}" height="${BAR_H}"/>`,
    );
    if (activity.slack > 0) {
      const sx = LABEL_W + activity.early_finish * scale;
      const sw = (activity.late_finish - activity.early_finish) * scale;
      parts.push(
        `<rect class="slack" x="${sx}" y="${y}" width="${sw}" height="${BAR_H}"/>`,
      );
    }
    parts.push(`</g>`);
  });

  const baseY = rows.length * ROW_H + 22;
  parts.push(
    `<text class="figure makespan" x="${LABEL_W}" y="${baseY}">makespan ${schedule.makespan} h — critical path ${escapeXml(
      schedule.critical_path.join(" → "),
    )}</text>`,
    `<text class="figure gain" x="${LABEL_W}" y="${baseY + 20}">gain ${relaxation.gain} h (${relaxation.percent_gain}%) vs serial ${relaxation.baseline_makespan} h</text>`,
    `</svg>`,
  );
  return parts.join("\n");
}
